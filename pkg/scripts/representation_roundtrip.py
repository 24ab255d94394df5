"""Induce tense operators on a product of chains from a time frame, then
recover the frame from the MV-morphisms and check the representation."""
import argparse

import numpy as np

from qtense import Frame, build, direct_power, direct_product, enumerate_mv_morphisms
from qtense.representation import frame_operators, verify_tense_representation
from qtense.tense import CLOSURES, random_time_frame


def round_trip(algebra, frame) -> bool:
    ops = frame_operators(algebra, frame)
    rep = verify_tense_representation(algebra, ops["G"], ops["H"],
                                      enumerate_mv_morphisms(algebra), complete=True)
    recovered = np.array(rep.details.get("relation", []), dtype=bool)
    same = recovered.shape == frame.R.shape and np.array_equal(recovered, frame.R)
    print(f"{algebra.name:8s} R={frame.R.astype(int).tolist()} {rep.verdict} "
          f"relation recovered: {same}")
    return rep.ok and same


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--chain", default="L3")
    ap.add_argument("--points", type=int, default=3)
    ap.add_argument("--frames", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    power = direct_power(build(args.chain), args.points)
    ok = True
    for i in range(args.frames):
        rng = np.random.default_rng(args.seed + i)
        ok &= round_trip(power, random_time_frame(rng, args.points, 0.5, CLOSURES[i % len(CLOSURES)]))
    # mixed factors: only relations inside each factor keep the carrier closed
    mixed = direct_product(build("L2"), build("L3"), name="L2xL3")
    for pairs in ([], [("p", "p")], [("q", "q")], [("p", "p"), ("q", "q")]):
        ok &= round_trip(mixed, Frame.from_pairs(["p", "q"], None, pairs))
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
