# Steady synthetic sequence generators
