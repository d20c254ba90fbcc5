# Estimation package: densities, information, bounds and probe search
