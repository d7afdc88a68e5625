#!/usr/bin/env python3
"""
Simple script to verify the rc-codes setup against the bundled appendix matrices
"""

import sys
import os

# Add src directory to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "src"))


def check_imports():
    """Check that the numerical stack imports"""
    try:
        import numpy
        import scipy
        import pandas
        import pydantic

        print(f"✅ numpy {numpy.__version__}, scipy {scipy.__version__}")
        print(f"✅ pandas {pandas.__version__}, pydantic {pydantic.VERSION}")
        return True
    except ImportError as e:
        print(f"❌ Import error: {e}")
        return False


def check_appendix():
    """Parse the bundled K = 8 matrices"""
    try:
        from rc_codes.hex_codec import load_appendix

        document = load_appendix()
        for section in document.sections:
            G = section.generator()
            print(
                f"✅ {section.name}: {G.ring} k1={G.k1} k2={G.k2} "
                f"n_sym={G.n_sym} fixed rows={section.fixed_rows}"
            )
        return len(document.sections) == 5
    except Exception as e:
        print(f"❌ Error parsing the appendix: {e}")
        return False


def check_required_dmin():
    """The d_min needed for FER 1e-8 at K = 8"""
    try:
        from rc_codes.bounds import SnrPoint, amplitude_factor, required_dmin

        expected = {(2, 0.0): 22, (2, 5.0): 7, (2, 10.0): 3, (4, 0.0): 43, (4, 5.0): 14, (4, 10.0): 5}
        ok = True
        for (M, snr), want in expected.items():
            got = required_dmin(8, 1e-8, SnrPoint(snr), amplitude_factor(M))
            mark = "✅" if got == want else "❌"
            ok = ok and got == want
            print(f"{mark} M={M} {snr:g} dB: d_min {got} (expected {want})")
        return ok
    except Exception as e:
        print(f"❌ Error evaluating the bound: {e}")
        return False


def check_verification():
    """Distance milestones of the appendix matrices"""
    try:
        from rc_codes.reports import verify_appendix

        report = verify_appendix()
        failed = [row for row in report.rows if not row["passed"]]
        for row in failed:
            print(f"❌ {row['section']} {row['check']} at {row['n_bits']} bits: {row['measured']}")
        print(f"{'✅' if report.passed else '❌'} {len(report.rows) - len(failed)}/{len(report.rows)} checks")
        return bool(report.passed)
    except Exception as e:
        print(f"❌ Error verifying the appendix: {e}")
        return False


def main():
    """Run all verification checks"""
    print("🔍 Verifying rc-codes Setup\n")

    checks = [
        ("Dependencies", check_imports),
        ("Appendix Matrices", check_appendix),
        ("Required d_min", check_required_dmin),
        ("Appendix Milestones", check_verification),
    ]

    results = []

    for name, check in checks:
        print(f"📋 {name}:")
        try:
            result = check()
            results.append(result)
            print(f"   Result: {'✅ PASS' if result else '❌ FAIL'}\n")
        except Exception as e:
            print(f"   Result: ❌ ERROR - {e}\n")
            results.append(False)

    passed = sum(results)
    total = len(results)

    print("=" * 50)
    print(f"📊 Summary: {passed}/{total} checks passed")

    if passed == total:
        print("🎉 All checks passed!")
        print("\nNext steps:")
        print("1. Reproduce a table: python run_workbench.py table --kind 3")
        print("2. Run the tests: pytest -m 'not slow'")
        return 0

    print("⚠️  Some checks failed. Please check the output above.")
    return 1


if __name__ == "__main__":
    sys.exit(main())
