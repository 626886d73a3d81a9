"""Physical constants and unit conventions.

Model units: energies and frequencies in wavenumbers (cm^-1), hbar = 1, so a
"time" multiplying a cm^-1 frequency in a phase factor is measured in cm.
Temperatures are in kelvin and enter only through k_B * T in cm^-1.

SI constants below are used solely by the extinction-spectrum ingestion, whose
mixed unit bookkeeping (molar extinction in L mol^-1 cm^-1, site dipole in
C cm) is documented in spectra.ingest_extinction.
"""

import math

#: Boltzmann constant in cm^-1 per kelvin.
KB_CM1_PER_K = 0.6950348

#: Avogadro constant, mol^-1.
N_AVOGADRO = 6.02214076e23

#: Vacuum permittivity, F/m.
EPSILON_0_F_PER_M = 8.8541878128e-12

#: Speed of light in cm/s.
C_CM_PER_S = 2.99792458e10

#: Reduced Planck constant, J s.
HBAR_J_S = 1.054571817e-34

#: One debye expressed in C cm (1 D = 3.33564e-30 C m).
DEBYE_C_CM = 3.33564e-28

LN10 = math.log(10.0)
