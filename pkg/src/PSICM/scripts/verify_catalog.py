import sys
import os

# Add src to path
sys.path.append(os.path.join(os.getcwd(), "src"))

from src.PSICM.certify.registry import registry
from src.PSICM.certify.verify import load_catalog, verify_bound

CORE_CATALOG_SIZE = 10


def verify(bound_name="log_minus_digamma_reciprocal"):
    print("Verifying Bound Registration...")
    load_catalog()
    names = registry.get_bound_names()
    print(f"Registered bounds: {names}")

    core = registry.get_bounds(core_only=True)
    if len(core) != CORE_CATALOG_SIZE:
        print(f"FAILURE: expected {CORE_CATALOG_SIZE} core bounds, found {len(core)}.")
        return False

    if not registry.bound_exists(bound_name):
        print(f"FAILURE: '{bound_name}' is NOT registered.")
        return False

    print(f"SUCCESS: '{bound_name}' is registered.")
    result = verify_bound(registry.get_bound(bound_name))
    print(f"Bound check result: passed={result.passed}, worst margin {result.worst_margin:.3e} at x={result.worst_x:.6g}")
    return result.passed


if __name__ == "__main__":
    if not verify(*sys.argv[1:2]):
        sys.exit(1)
