"""Run the independent Hunter-search oracle and freeze its census to JSON."""

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from cubic_oracle import oracle_fields  # noqa: E402


def census_digest(fields):
    text = "\n".join(f"{d}:{''.join(map(str, fp))}" for d, fp in fields)
    return hashlib.sha256(text.encode()).hexdigest()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=10**5)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests" / "data" / "cubic_oracle.json"))
    args = ap.parse_args(argv)
    t0 = time.time()
    fields, primes = oracle_fields(args.bound)
    thresholds = [b for b in (10**3, 10**4, 10**5, 10**6) if b <= args.bound]
    counts = {
        str(b): {"real": sum(1 for d, _ in fields if 0 < d < b), "complex": sum(1 for d, _ in fields if -b < d < 0)}
        for b in thresholds
    }
    payload = {
        "bound": args.bound,
        "fingerprint_primes": primes,
        "counts": counts,
        "digest": census_digest(fields),
        "smallest": [d for d, _ in sorted(fields, key=lambda f: abs(f[0]))[:12]],
        "seconds": round(time.time() - t0, 1),
    }
    Path(args.out).write_text(json.dumps(payload, indent=1) + "\n")
    print(json.dumps({k: v for k, v in payload.items() if k != "fingerprint_primes"}, indent=1))


if __name__ == "__main__":
    main()
