"""Distance energies, representation sieves and Epstein zeta tools."""
