"""Physical constants shared across modules.

Model parameters (latent heats, volumes, areas, ...) live in the config,
not here; this module only holds quantities that are definitional.
"""

R_GAS = 8.314  # J/(mol K), matches the accounting formulas throughout

# 1 sccm = 1 standard cm^3/min at 273.15 K, 101325 Pa -> mol/s
SCCM_TO_MOL_PER_S = 1.0 / (22414.0 * 60.0)

HBAR = 1.054571817e-34  # J s

# Below roughly one monolayer the film phase is reported as absent.
MONOLAYER_M = 0.3e-9
