"""
Pacote app principal do laboratório de aquisição paralela
"""
