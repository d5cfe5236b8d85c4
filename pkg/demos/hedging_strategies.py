"""Why selecting which forecasts get assessed invites hedging, and the fix.

Run: python demos/hedging_strategies.py
"""

from veriscore import simulate_hedging

HEADLINE = {
    1: "Option 1: assess forecasts for events whose outcome ends above 20.",
    2: "Option 2: assess when either forecaster predicted above 20.",
    3: "Option 3: assess when a forecast or the outcome is above 20.",
    4: "Option 4: assess when the *rival* forecast is above 20.",
    5: "Option 5: score the above-20 component on every event.",
}

for option in (1, 2, 3, 4, 5):
    rep = simulate_hedging(option, seed=0)
    print(HEADLINE[option])
    print(f"  {rep.note}")
    h = rep.honest
    print(
        f"  honest: {h.n_assessed} assessed, mean squared error "
        f"{h.mean_score:.1f}"
    )
    for s in rep.strategies:
        verdict = (
            "gains" if s.gain > 2 * s.gain_se
            else "loses" if s.gain < -2 * s.gain_se
            else "gains nothing"
        )
        print(
            f"  {s.name}: {s.n_assessed} assessed, mean {s.mean_score:.1f}, "
            f"gain {s.gain:+.1f} (se {s.gain_se:.1f}) -> {verdict}"
        )
    print()

print("Options 1-3 condition assessment on outcomes or forecasts, so a")
print("strategic forecaster profits by steering which events are scored.")
print("Option 4 keys assessment to the rival only; strategy changes what")
print("is submitted, not what is assessed, and the gain vanishes.")
print("Option 5 needs no selection at all: every event is scored with the")
print("above-threshold component of squared error, the threshold games")
print("gain exactly nothing, and understating the tail becomes costly.")
