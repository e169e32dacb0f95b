# API schemas package