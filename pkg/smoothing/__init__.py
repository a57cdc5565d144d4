# Steady temporal smoothing modules
