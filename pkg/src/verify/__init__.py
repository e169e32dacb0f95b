# Verification oracle package