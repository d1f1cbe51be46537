"""
TactileSensePro Test Suite

Unit and integration tests for the scripts package and the command line.
"""
