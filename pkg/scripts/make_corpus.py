"""Regenerate the checked-in corpus documents."""
from __future__ import annotations

import argparse
from pathlib import Path

from geohom.corpus import write_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("directory", nargs="?", default=Path(__file__).resolve().parents[1] / "corpus")
    args = parser.parse_args()
    for name in write_corpus(args.directory):
        print(name)


if __name__ == "__main__":
    main()
