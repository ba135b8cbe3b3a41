"""
Integration tests for splurge-geomrep.

These run whole check suites on configs and on randomly drawn inputs.
"""
