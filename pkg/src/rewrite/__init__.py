# Measurement rewrite package