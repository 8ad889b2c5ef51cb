"""
modelos de domínio (objetos numéricos imutáveis)
"""
