#!/usr/bin/env python3
"""
Shortcut into tests/run_tests.py.

    python test_runner.py            full suite
    python test_runner.py quick      skip the MMS, CLI and acceptance modules
    python test_runner.py mms        one category by name
"""

import sys
import os

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from tests.run_tests import TEST_CATEGORIES, run_all_tests, run_quick_tests, run_test_category

SUITES = {
    'all': run_all_tests,
    'full': run_all_tests,
    'quick': run_quick_tests,
    'fast': run_quick_tests,
}


def main():
    command = sys.argv[1].lower() if len(sys.argv) > 1 else 'all'

    if command in ('help', '-h', '--help'):
        print_help()
        sys.exit(0)

    if command in SUITES:
        ok = SUITES[command]()
    elif command in TEST_CATEGORIES:
        ok = run_test_category(command)
    else:
        print(f"Unknown command: {command}")
        print_help()
        sys.exit(2)
    sys.exit(0 if ok else 1)


def print_help():
    print(f"""
Usage: python test_runner.py [all|quick|CATEGORY|help]

  all, full     every test module (default)
  quick, fast   {', '.join(sorted(set(TEST_CATEGORIES) - {'mms', 'cli', 'acceptance'}))}
  CATEGORY      one of: {', '.join(TEST_CATEGORIES)}

Finer control (verbosity, benchmarks, prerequisite check): python tests/run_tests.py --help
""")


if __name__ == "__main__":
    main()
