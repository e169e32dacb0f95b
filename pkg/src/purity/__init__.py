# Purity test package