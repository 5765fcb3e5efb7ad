"""Writes the synthetic weekly rate fixture used by the backtest golden test.

Usage: PYTHONPATH=build/python python3 tools/make_fixture.py tests/data/synthetic_rates.csv
"""

import datetime
import sys

import volint

ROWS = 1545
SEED = 19700102


def main(path):
    levels = volint.simulate_cir(ROWS, delta=1 / 52, seed=SEED)
    day = datetime.date(1970, 1, 2)
    with open(path, "w") as f:
        f.write("date,value\n")
        for r in levels:
            f.write(f"{day.isoformat()},{100 * r:.2f}\n")
            day += datetime.timedelta(days=7)


if __name__ == "__main__":
    main(sys.argv[1])
