"""Check the threshold terms t_r on the dyadic grid and print the terms for
the coarse grid."""
import argparse

from qtense.unit import dyadic_grid, threshold_term, verify_threshold


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-k", type=int, default=8, help="grid exponent")
    ap.add_argument("--show", type=int, default=3, help="print terms for r on the 2^-show grid")
    args = ap.parse_args()
    for r in dyadic_grid(args.show)[1:-1]:
        print(f"t_{r} = {threshold_term(r)}")
    rep = verify_threshold(args.k)
    print(rep.to_text())
    raise SystemExit(rep.exit_code)


if __name__ == "__main__":
    main()
