"""Shop front back office."""
