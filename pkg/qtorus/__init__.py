"""
Quantized torus diagnostics at h = 1/N
"""
