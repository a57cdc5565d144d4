# Steady temporal quality metrics
