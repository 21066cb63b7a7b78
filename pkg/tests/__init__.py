# Test package for the Pearson IV variate library
