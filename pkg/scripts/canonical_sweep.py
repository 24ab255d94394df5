"""Certify the canonical operators G*, H*, P*, F* on seeded random time
frames over finite chains."""
import argparse
import time

import numpy as np

from qtense import build, canonical_tense
from qtense.config import Config
from qtense.tense import CLOSURES, random_time_frame


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--chains", nargs="+", default=["L3", "L5"])
    ap.add_argument("--frames", type=int, default=50)
    ap.add_argument("--max-size", type=int, default=4)
    ap.add_argument("--density", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=1000)
    args = ap.parse_args()
    cfg = Config(seed=args.seed)
    start = time.perf_counter()
    failures = 0
    for i in range(args.frames):
        rng = np.random.default_rng(cfg.seed + i)
        M = build(args.chains[i % len(args.chains)])
        size = int(rng.integers(1, args.max_size + 1))
        closure = CLOSURES[i % len(CLOSURES)]
        frame = random_time_frame(rng, size, args.density, closure)
        rep = canonical_tense(M, frame).certify(cap=cfg.exhaustive_cap, samples=cfg.samples, seed=i)
        failures += not rep.ok
        props = ",".join(rep.details["properties"]) or "-"
        print(f"{i:3d} {M.name:3s} |S|={size} {closure:10s} {rep.details['mode']:10s} "
              f"props={props:30s} {rep.verdict}")
        if not rep.ok:
            print(rep.to_text())
    print(f"{args.frames} frames, {failures} violations, {time.perf_counter() - start:.2f}s")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
