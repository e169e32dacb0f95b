# Quantum constant propagation package