# Steady optical flow modules
