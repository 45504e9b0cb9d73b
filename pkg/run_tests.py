#!/usr/bin/env python3
"""
Test runner for semiscale.
Runs the suite with optional coverage, linting and type checking.
"""

import argparse
import subprocess
import sys
import time
from datetime import datetime

PERFORMANCE_TESTS = "tests/semiscale/test_performance.py"

MODULES = {
    "funcspace": "tests/semiscale/core/test_funcspace.py",
    "library": "tests/semiscale/core/test_library.py",
    "semigroups": "tests/semiscale/core/test_semigroups.py",
    "resolvent": "tests/semiscale/core/test_resolvent.py",
    "scales": "tests/semiscale/core/test_scales.py",
    "extrapolation": "tests/semiscale/core/test_extrapolation.py",
    "sweep_cache": "tests/semiscale/utils/test_sweep_cache.py",
    "logging": "tests/semiscale/utils/test_logging.py",
    "runner": "tests/semiscale/test_runner.py",
    "cli": "tests/semiscale/test_cli.py",
    "performance": PERFORMANCE_TESTS,
}


class Colors:
    """ANSI color codes for terminal output"""

    HEADER = "\033[95m"
    BLUE = "\033[94m"
    CYAN = "\033[96m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    RED = "\033[91m"
    ENDC = "\033[0m"
    BOLD = "\033[1m"


def print_header(text):
    print(f"\n{Colors.HEADER}{Colors.BOLD}{'=' * 60}{Colors.ENDC}")
    print(f"{Colors.HEADER}{Colors.BOLD}{text.center(60)}{Colors.ENDC}")
    print(f"{Colors.HEADER}{Colors.BOLD}{'=' * 60}{Colors.ENDC}\n")


def run_command(cmd, description=None):
    """Run a command, print its status and return the completed process"""
    if description:
        print(f"\n{Colors.CYAN}{Colors.BOLD}→ {description}{Colors.ENDC}")
    print(f"{Colors.BLUE}$ {' '.join(cmd)}{Colors.ENDC}")

    start_time = time.time()
    result = subprocess.run(cmd, capture_output=True, text=True)  # noqa: S603
    duration = time.time() - start_time

    if result.returncode == 0:
        print(f"{Colors.GREEN}✓ Success ({duration:.2f}s){Colors.ENDC}")
    else:
        print(f"{Colors.RED}✗ Failed ({duration:.2f}s){Colors.ENDC}")
        if result.stderr:
            print(f"{Colors.RED}Error: {result.stderr}{Colors.ENDC}")
    return result


def pytest_command(args, extra=None):
    cmd = [sys.executable, "-m", "pytest"]
    if args.file:
        cmd.append(args.file)
    elif args.module:
        cmd.append(MODULES[args.module])
    else:
        cmd.append("tests/")
        if not args.include_performance:
            cmd.append(f"--ignore={PERFORMANCE_TESTS}")

    cmd.extend(["-v", "-s"] if args.verbose else ["-v"])
    if args.stop_on_failure:
        cmd.append("-x")
    if args.failed_first:
        cmd.append("--ff")
    if args.coverage:
        cmd.extend(["--cov=semiscale", "--cov-report=term-missing", "--cov-report=html"])
    if args.keyword:
        cmd.extend(["-k", args.keyword])
    return cmd + (extra or [])


def run_tests(args):
    result = run_command(pytest_command(args), "Running tests")
    if result.stdout:
        print(result.stdout)
    return result.returncode == 0


def run_tool(name, cmd, description):
    if subprocess.run(["which", name], capture_output=True).returncode != 0:  # noqa: S603, S607
        print(f"{Colors.YELLOW}⚠ {name} not installed. Skipping.{Colors.ENDC}")
        print(f"  Install with: pip install {name}")
        return True
    result = run_command(cmd, description)
    if result.returncode != 0 and result.stdout:
        print(result.stdout)
    return result.returncode == 0


def main():
    parser = argparse.ArgumentParser(
        description="Run tests for semiscale",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python run_tests.py                    # Run all tests (except performance)
  python run_tests.py -p                 # Include the default-grid acceptance tests
  python run_tests.py -c                 # Run with coverage
  python run_tests.py -m scales          # Run only the scale estimator tests
  python run_tests.py -k "chain"         # Run tests matching keyword
  python run_tests.py --all              # Run tests, lint and type checks
        """,
    )
    parser.add_argument("-m", "--module", choices=sorted(MODULES), help="Run tests for specific module")
    parser.add_argument("-f", "--file", help="Run specific test file")
    parser.add_argument("-k", "--keyword", help="Run tests matching keyword expression")
    parser.add_argument("-v", "--verbose", action="store_true", help="Verbose output")
    parser.add_argument("-x", "--stop-on-failure", action="store_true", help="Stop on first failure")
    parser.add_argument("--ff", "--failed-first", action="store_true", dest="failed_first", help="Run failed first")
    parser.add_argument("-c", "--coverage", action="store_true", help="Run with coverage report")
    parser.add_argument(
        "-p", "--include-performance", action="store_true", help="Include performance tests (excluded by default)"
    )
    parser.add_argument("-l", "--lint", action="store_true", help="Run ruff")
    parser.add_argument("-t", "--type-check", action="store_true", help="Run mypy")
    parser.add_argument("-a", "--all", action="store_true", help="Run all checks (tests, lint, type)")
    args = parser.parse_args()

    print_header("semiscale Test Runner")
    print(f"Started at: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")

    success = True
    if args.lint or args.all:
        success &= run_tool("ruff", ["ruff", "check", "semiscale/", "tests/"], "Running ruff linter")
    if args.type_check or args.all:
        success &= run_tool("mypy", ["mypy", "semiscale/", "--ignore-missing-imports"], "Running mypy type checker")
    print_header("Running Tests")
    success &= run_tests(args)

    print_header("Summary")
    if success:
        print(f"{Colors.GREEN}{Colors.BOLD}✓ All checks passed!{Colors.ENDC}")
    else:
        print(f"{Colors.RED}{Colors.BOLD}✗ Some checks failed!{Colors.ENDC}")
    print(f"\nCompleted at: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())
