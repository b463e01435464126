"""Replay harness: instance files, trace rows, invariant checks and the run loop.

Import submodules directly; `rematch.harness.runner` depends on the algorithm registry,
which in turn imports the checks.
"""
