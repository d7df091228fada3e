#!/usr/bin/env python3
"""
Installation test script.

This script verifies that:
1. All dependencies are installed
2. Every module imports
3. Each layer reproduces one known value
"""

import importlib
import math
import sys


def check_dependencies():
    """Check that all required dependencies are installed."""
    print("🔍 Testing dependencies...")

    required_packages = {
        'numpy': 'Array arithmetic',
        'scipy': 'QUADPACK and special functions',
        'mpmath': 'Arbitrary precision reference values',
        'dotenv': 'Python dotenv',
        'colorama': 'Colored terminal output',
        'pytest': 'Test runner',
    }

    missing = []
    for package, description in required_packages.items():
        try:
            importlib.import_module(package)
            print(f"  ✓ {description} ({package})")
        except ImportError:
            print(f"  ✗ {description} ({package}) - MISSING")
            missing.append(package)

    if missing:
        print(f"\n❌ Missing dependencies: {', '.join(missing)}")
        print("   Run: pip install -r requirements.txt")
        return False

    print("  ✅ All dependencies installed\n")
    return True


def check_imports():
    """Check that all project modules can be imported."""
    print("🔍 Testing module imports...")

    modules = [
        'errors',
        'config',
        'specfun',
        'corpus',
        'quadrature',
        'mellin',
        'fraclap',
        'onesided',
        'sfde',
        'cli',
    ]

    failed = []
    for module in modules:
        try:
            importlib.import_module(module)
            print(f"  ✓ {module}.py")
        except Exception as e:
            print(f"  ✗ {module}.py - ERROR: {str(e)}")
            failed.append(module)

    if failed:
        print(f"\n❌ Failed to import: {', '.join(failed)}")
        return False

    print("  ✅ All modules imported successfully\n")
    return True


def check_known_values():
    """One cheap closed-form value per layer."""
    print("🔍 Testing known values...")

    try:
        from corpus import get_test_function
        from fraclap import fourier_route
        from mellin import FracOrder, laplacian_multiplier
        from onesided import HalfLineFunction, caputo
        from sfde import StableDensity, stable_pdf
        from specfun import gamma

        gaussian = get_test_function("gaussian").radial(1)
        checks = [
            ("Gamma(1/2) = sqrt(pi)", gamma(0.5), math.sqrt(math.pi)),
            ("1-D multiplier at s = 1/2, alpha = 1", laplacian_multiplier(0.5, FracOrder(1.0)), 0.5),
            ("L exp(-x^2) at 0, alpha = 1", fourier_route(gaussian, FracOrder(1.0), 0.0), -2.0 / math.sqrt(math.pi)),
            ("Caputo half-derivative of t at 1", caputo(HalfLineFunction.polynomial([0.0, 1.0]), 0.5, 1.0),
             2.0 / math.sqrt(math.pi)),
            ("Cauchy density at 0", stable_pdf(StableDensity(1.0), 0.0), 1.0 / math.pi),
        ]

        ok = True
        for label, value, expected in checks:
            error = abs(complex(value) - expected)
            if error < 1e-9:
                print(f"  ✓ {label}")
            else:
                print(f"  ✗ {label}: got {complex(value).real:.12g}, expected {expected:.12g}")
                ok = False

        if ok:
            print("  ✅ Known values reproduced\n")
        return ok

    except Exception as e:
        print(f"  ✗ Evaluation error: {str(e)}")
        return False


def main():
    """Run all checks."""
    print("""
╔═══════════════════════════════════════════════════════════════╗
║                                                               ║
║          Fractional Laplacian - Installation Test            ║
║                                                               ║
╚═══════════════════════════════════════════════════════════════╝
""")

    checks = [
        ("Dependencies", check_dependencies),
        ("Module Imports", check_imports),
        ("Known Values", check_known_values),
    ]

    results = []
    for name, check_func in checks:
        try:
            result = check_func()
            results.append(result)
        except Exception as e:
            print(f"\n❌ Check '{name}' crashed: {str(e)}")
            results.append(False)

    print("\n" + "="*60)
    if all(results):
        print("✅ ALL TESTS PASSED!")
        print("\n🎉 System is ready to use!")
        print("\nTry: python cli.py apply --alpha 1 --x 0")
        print("  or: python cli.py compare --alpha 1.5 --func lorentz --x 0,1,2")
        return 0
    else:
        print("❌ SOME TESTS FAILED")
        print("\nPlease fix the issues above before using the system.")
        return 1


def test_installation():
    assert main() == 0


if __name__ == "__main__":
    sys.exit(main())
