#!/usr/bin/env python3
# Independent frequency counts over the fixture CSV. The printed values are
# frozen into tests/event_data_test.cc; rerun after regenerating fixtures.
import csv
import sys
from collections import Counter

path = sys.argv[1] if len(sys.argv) > 1 else "tests/data/fixture_shots.csv"
threshold = 25
with open(path, newline="", encoding="utf-8") as f:
    rows = list(csv.DictReader(f))

print("rows", len(rows))
categorical = ["home_away", "situation", "shot_type", "last_action"]
columns = 3  # minute, distance_to_goal, angle_to_goal
for name in categorical:
    counts = Counter(r[name] for r in rows)
    kept = sorted((c for c in counts.items() if c[1] >= threshold),
                  key=lambda kv: (-kv[1], kv[0]))
    merged = len(counts) - len(kept)
    width = len(kept) + (1 if merged else 0)
    columns += width
    print(name, "observed", len(counts), "kept", len(kept), "width", width)
    if name == "last_action":
        print("last_action kept order", [k for k, _ in kept])
print("columns", columns)

for player in ["Youssoufa Moukoko", "Alejandro Garnacho", "Mathys Tel",
               "Jamie Bynoe-Gittens", "Evan Ferguson"]:
    sel = [r for r in rows if r["player"] == player and r["season"] == "2022/23"]
    print("player", player, len(sel), sum(int(r["is_goal"]) for r in sel))
for team in ["FC Köln", "RCD Espanyol", "Brentford FC"]:
    sel = [r for r in rows if r["opponent"] == team and r["on_target"] == "1"]
    print("conceded_on_target", team, len(sel), sum(int(r["is_goal"]) for r in sel))
