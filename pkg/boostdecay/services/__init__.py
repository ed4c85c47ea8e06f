"""
Numerical services: special functions, Prony fits, lab-frame decay laws,
exponential windows, the time map and the quadrature oracle
"""
