# API V1 module
