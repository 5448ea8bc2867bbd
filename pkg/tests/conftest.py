from hypothesis import settings

# numerical property tests: no wall-clock flakes, reproducible examples
settings.register_profile("ci", deadline=None, derandomize=True)
settings.load_profile("ci")
