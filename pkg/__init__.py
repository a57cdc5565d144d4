# Steady - Temporal Smoothing Engine
