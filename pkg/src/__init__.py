"""Pearson IV and betaized Meixner-Morris random variate library."""
