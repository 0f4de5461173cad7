#!/usr/bin/env python3
"""Place MovieLens 100k ratings at data/ml-100k/u.data.

Sources, in order:
  --zip PATH   the ml-100k.zip distributed by GroupLens
  default      the copy bundled in the recbole wheel, fetched with pip
"""

import argparse
import io
import pathlib
import subprocess
import sys
import tempfile
import zipfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "ml-100k" / "u.data"


def from_grouplens(zip_path):
    with zipfile.ZipFile(zip_path) as z:
        return z.read("ml-100k/u.data").decode("latin-1")


def from_recbole():
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
             "-d", tmp, "recbole==1.2.1"],
            check=True,
        )
        wheel = next(pathlib.Path(tmp).glob("recbole-*.whl"))
        with zipfile.ZipFile(wheel) as z:
            text = z.read("recbole/dataset_example/ml-100k/ml-100k.inter").decode("utf-8")
    # Header: user_id:token item_id:token rating:float timestamp:float
    lines = io.StringIO(text).read().splitlines()[1:]
    out = []
    for line in lines:
        user, item, rating, ts = line.split("\t")
        out.append(f"{user}\t{item}\t{int(float(rating))}\t{int(float(ts))}")
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--zip", type=pathlib.Path, help="GroupLens ml-100k.zip")
    args = ap.parse_args()

    text = from_grouplens(args.zip) if args.zip else from_recbole()
    rows = text.count("\n")
    if rows != 100000:
        sys.exit(f"expected 100000 ratings, got {rows}")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(text)
    print(f"wrote {rows} ratings to {OUT}")


if __name__ == "__main__":
    main()
