"""
Test package for splurge-geomrep.

Unit tests live here; ``integration`` and ``e2e`` hold the slower suites.
"""
