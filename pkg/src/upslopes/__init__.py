"""U_p on overconvergent p-adic modular forms for the genus-one primes 11, 17, 19."""

__version__ = "0.1.0"

GENUS_ONE_PRIMES = (11, 17, 19)
