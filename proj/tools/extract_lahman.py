#!/usr/bin/env python3
"""Write the team-season extract and franchise map shipped under data/.

Source: the Lahman Baseball Database (CC BY-SA 3.0) as bundled in the
`pylahman` wheel. Usage: extract_lahman.py <pylahman.whl> <out_dir>
"""
import io
import sys
import zipfile

import pandas as pd

COLUMNS = ["yearID", "lgID", "teamID", "franchID", "G", "R", "H", "HR", "BB",
           "SO", "SB", "AB", "RA", "HA", "HRA", "BBA", "SOA", "attendance",
           "name"]
LAST_YEAR = 2020

# Modern names that differ from the franchise's latest Lahman name.
NAME_OVERRIDES = {"CLE": "Cleveland Guardians", "ANA": "Los Angeles Angels",
                  "FLA": "Miami Marlins", "TBD": "Tampa Bay Rays"}
# Historical codes that some extracts carry in place of the franchise id.
ALIASES = {"MON": "WSN", "SEP": "MIL", "WSA": "TEX", "KCA": "OAK",
           "MLN": "ATL", "BSN": "ATL", "BRO": "LAD",
           "NY1": "SFG", "SLA": "BAL", "WS1": "MIN", "FLO": "FLA",
           "CAL": "ANA", "LAA": "ANA", "TBA": "TBD", "MIA": "FLA"}


def main(wheel, out_dir):
    z = zipfile.ZipFile(wheel)
    teams = pd.read_parquet(io.BytesIO(z.read("pylahman/data/Teams.parquet")))
    franchises = pd.read_parquet(
        io.BytesIO(z.read("pylahman/data/TeamsFranchises.parquet")))

    teams = teams[teams.yearID <= LAST_YEAR][COLUMNS]
    teams = teams.sort_values(["yearID", "franchID"])
    for col in COLUMNS[4:-1]:
        teams[col] = teams[col].astype("Int64")
    teams.to_csv(f"{out_dir}/lahman_teams_1871_2020.csv", index=False)

    latest = teams.sort_values("yearID").groupby("franchID").name.last()
    rows = []
    for fid, fname in zip(franchises.franchID, franchises.franchName):
        name = NAME_OVERRIDES.get(fid, latest.get(fid, fname))
        rows.append((fid, fid, fid, name))
    for alias, target in ALIASES.items():
        rows.append((alias, target, target, NAME_OVERRIDES.get(target, latest[target])))
    out = pd.DataFrame(rows, columns=["franchID", "canonical", "label", "name"])
    out.to_csv(f"{out_dir}/franchises.csv", index=False)


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
