"""Driving the command line tool from Python; the same runs work as `entropylab ...`."""

import tempfile
from pathlib import Path

from entropylab.cli import main

main(["entropy", "--lambda", "1", "--a", "1", "--n-list", "10,100"])
main(["mrs", "--lambda", "5", "--a", "5", "--n-list", "50,500"])
main(["verify", "--lambda", "1", "--a", "1"])

with tempfile.TemporaryDirectory() as tmp:
    main(["figures", "--n-max", "10", "--output", tmp])
    for f in sorted(Path(tmp).iterdir()):
        print(f.name, len(f.read_text().splitlines()), "lines")
