import argparse
from pathlib import Path
import sys

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))

from app.capacity import pmax_capacity
from app.channels import ProtocolKind
from app.optimize import Q_UPPER, QMode, best_block_length, pmax_search


def main():
    parser = argparse.ArgumentParser(description="Print the threshold table for capacity bounds and key rates")
    parser.add_argument("--max-cat", type=int, default=9, help="Largest cat code block length")
    parser.add_argument("--tol", type=float, default=1e-7, help="Bisection tolerance in p")
    parser.add_argument("--threads", type=int, default=None)
    args = parser.parse_args()

    print("Depolarizing channel")
    print(f"  hashing            p_max = {pmax_capacity(1, 1, tol=args.tol, threads=args.threads):.7f}")
    for m in range(2, args.max_cat + 1):
        print(f"  cat m={m:<2}           p_max = {pmax_capacity(m, 1, tol=args.tol, threads=args.threads):.7f}")

    for kind in (ProtocolKind.BB84, ProtocolKind.SIX_STATE):
        print(kind.value)
        no_noise = pmax_search(kind, 1, QMode.fixed(0.0), tol_p=args.tol)
        noisy = pmax_search(kind, 1, QMode.fixed(Q_UPPER), tol_p=args.tol)
        best_m, best_p = best_block_length(kind, range(1, 11), q=0.0, tol_p=args.tol)
        print(f"  m=1, q=0           p_max = {no_noise:.7f}")
        print(f"  m=1, q={Q_UPPER}      p_max = {noisy:.7f}")
        print(f"  best m={best_m:<2}, q=0     p_max = {best_p:.7f}")


if __name__ == "__main__":
    main()
