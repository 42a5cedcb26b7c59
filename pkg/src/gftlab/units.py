"""Physical constants and unit conversions.

All library computation is in atomic units (m_e = hbar = e = 1).  Conversion
to eV and nm happens only at the reporting layer, through this table.
"""

HARTREE_EV = 27.2114
"""Atomic unit of energy in eV."""

RYDBERG_EV = HARTREE_EV / 2.0
"""Hydrogen ground-state binding energy in eV."""

BOHR_NM = 0.0529177
"""Bohr radius in nm."""

BOLTZMANN_EV_PER_K = 8.61733e-5


def hartree_to_ev(energy):
    return energy * HARTREE_EV


def ev_to_hartree(energy):
    return energy / HARTREE_EV


def bohr_to_nm(length):
    return length * BOHR_NM


def nm_to_bohr(length):
    return length / BOHR_NM
