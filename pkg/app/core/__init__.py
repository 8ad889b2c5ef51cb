"""
Pacote core contém configurações e funções compartilhadas
"""