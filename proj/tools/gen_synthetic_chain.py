#!/usr/bin/env python3
"""Writes the synthetic ETH option chain used by tests and the README example.

Premiums come from Black-Scholes (zero rates) with a mild put skew, quoted in
the base asset and rounded to a 0.0005 tick, the way a crypto options venue
quotes them. The data is synthetic; it is not a market snapshot.
"""
import json
import math
import sys

SPOT = 1700.0
EXPIRY = "2024-07-26"
SNAPSHOT = "2024-06-26T08:00:00Z"
T = 30.0 / 365.0
STRIKES = [1000 + 60 * i for i in range(25)]
TICK = 0.0005


def ncdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def black_scholes(kind, s, k, vol, t):
    d1 = (math.log(s / k) + 0.5 * vol * vol * t) / (vol * math.sqrt(t))
    d2 = d1 - vol * math.sqrt(t)
    call = s * ncdf(d1) - k * ncdf(d2)
    return call if kind == "call" else call - s + k


def vol(k):
    return 0.62 + 0.18 * max(0.0, math.log(SPOT / k))


def tick(v):
    return round(round(v / TICK) * TICK, 4)


def rows():
    for kind in ("put", "call"):
        for k in STRIKES:
            mark = black_scholes(kind, SPOT, k, vol(k), T) / SPOT
            half = max(TICK, 0.04 * mark)
            bid = tick(mark - half)
            ask = tick(mark + half)
            mark = tick(mark)
            if mark < TICK:
                mark = TICK
            yield kind, k, (bid if bid > 0 else None), max(ask, mark), mark


def fmt(v):
    return "" if v is None else ("%.15g" % v)


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "data/synthetic_eth_chain"
    with open(out + ".csv", "w") as f:
        f.write("underlying,snapshot_time,spot,kind,strike,expiry,bid,ask,mark,premium_ccy\n")
        for kind, k, bid, ask, mark in rows():
            f.write(",".join(["ETH", SNAPSHOT, fmt(SPOT), kind, fmt(k), EXPIRY,
                              fmt(bid), fmt(ask), fmt(mark), "base"]) + "\n")
    quotes = []
    for kind, k, bid, ask, mark in rows():
        q = {"kind": kind, "strike": k, "expiry": EXPIRY}
        if bid is not None:
            q["bid"] = bid
        q["ask"] = ask
        q["mark"] = mark
        q["premium_ccy"] = "base"
        quotes.append(q)
    with open(out + ".json", "w") as f:
        json.dump({"underlying": "ETH", "snapshot_time": SNAPSHOT, "spot": SPOT,
                   "quotes": quotes}, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
