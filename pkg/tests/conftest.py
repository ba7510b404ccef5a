"""Shared pytest configuration.

Keeping this file here also puts the tests directory on sys.path, so test
modules can import the local ``oracles`` helpers.
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")
