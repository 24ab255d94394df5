"""Regenerate the bundled algebra files (all but the two fig1 files)."""
from pathlib import Path

from qtense.algebra import validate_effect_axioms
from qtense.bundled import BUNDLED, build
from qtense.io import serialize_algebra

DATA = Path(__file__).resolve().parents[1] / "src" / "qtense" / "data"


def main() -> None:
    for name in BUNDLED:
        if name.startswith("fig1"):
            continue
        algebra = build(name)
        assert validate_effect_axioms(algebra).ok, name
        (DATA / f"{name}.alg").write_text(serialize_algebra(algebra))
        print(f"wrote {name}.alg ({algebra.n} elements)")


if __name__ == "__main__":
    main()
