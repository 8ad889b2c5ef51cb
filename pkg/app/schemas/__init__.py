"""
schemas de configuração e relatórios
"""
