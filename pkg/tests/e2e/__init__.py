"""
End-to-end tests for splurge-geomrep.

These run the installed module as a subprocess and check exit codes,
report output and written files.
"""
