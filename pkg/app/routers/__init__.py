"""
routers da linha de comando
"""
