#!/usr/bin/env python3
"""
Master test runner for mirs.
This script discovers and runs all tests in the test directory structure.
"""

import argparse
import os
import subprocess
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def discover_tests(directory):
    """Discover test modules in the specified directory."""
    if not os.path.exists(directory):
        print(f"Warning: Directory {directory} does not exist, skipping.")
        return []

    tests = []
    for root, _, files in os.walk(directory):
        for file in sorted(files):
            if file.startswith("test_") and file.endswith(".py"):
                tests.append(os.path.join(root, file))
    return tests


def run_python_tests(tests, verbose=False, show_output=False):
    """Run each test module in its own interpreter using unittest."""
    print(f"\n{'='*30}\nRunning {len(tests)} test modules\n{'='*30}")

    if not tests:
        print("No tests found.")
        return True

    success = True
    for test in tests:
        rel_path = os.path.relpath(test, ROOT)
        print(f"\nRunning: {rel_path}")

        # Convert file path to module path
        module_path = rel_path.replace(os.path.sep, ".")[:-len(".py")]
        command = [sys.executable, "-m", "unittest", module_path]
        if verbose:
            command.append("-v")

        try:
            if show_output:
                result = subprocess.run(command, cwd=ROOT)
            else:
                result = subprocess.run(command, cwd=ROOT, stdout=subprocess.PIPE, stderr=subprocess.PIPE)
        except OSError as e:
            success = False
            print(f"Error running test {rel_path}: {str(e)}")
            continue

        if result.returncode != 0:
            success = False
            print(f"Test failed: {rel_path}")
            if verbose and not show_output:
                print("\nStdout:")
                print(result.stdout.decode())
                print("\nStderr:")
                print(result.stderr.decode())
        else:
            print(f"Test passed: {rel_path}")

    return success


def main():
    """Main function to parse arguments and run tests."""
    parser = argparse.ArgumentParser(description="Run mirs tests")
    parser.add_argument("--verbose", action="store_true", help="Show verbose output")
    parser.add_argument("--show-output", action="store_true", help="Show test output")
    parser.add_argument("--unit-only", action="store_true", help="Run only unit tests")
    parser.add_argument("--integration-only", action="store_true", help="Run only integration tests")
    parser.add_argument("--e2e-only", action="store_true", help="Run only end-to-end tests")
    args = parser.parse_args()

    script_dir = os.path.dirname(os.path.abspath(__file__))
    test_directories = {
        "unit": os.path.join(script_dir, "unit"),
        "integration": os.path.join(script_dir, "integration"),
        "e2e": os.path.join(script_dir, "e2e")
    }

    if args.unit_only:
        selected_dirs = {"unit": test_directories["unit"]}
    elif args.integration_only:
        selected_dirs = {"integration": test_directories["integration"]}
    elif args.e2e_only:
        selected_dirs = {"e2e": test_directories["e2e"]}
    else:
        selected_dirs = test_directories

    all_tests = []
    for dir_name, dir_path in selected_dirs.items():
        print(f"Discovering tests in {dir_name} directory...")
        tests = discover_tests(dir_path)
        all_tests.extend(tests)
        print(f"Found {len(tests)} test modules")

    success = run_python_tests(all_tests, args.verbose, args.show_output)

    print(f"\n{'='*50}")
    if success:
        print("All tests passed.")
    else:
        print("Some tests failed. See output above for details.")
        sys.exit(1)


if __name__ == "__main__":
    main()
