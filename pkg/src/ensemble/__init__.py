# Ensemble semantics package