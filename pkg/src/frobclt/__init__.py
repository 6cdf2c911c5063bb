"""Frobenius statistics, local densities and moment checks for S3/S4/S5 field families."""
