# Steady frame modules
