"""
Router do subcomando recover.
"""
from app.api.endpoints import recover
from app.routers.base import CommandRouter

router = CommandRouter(name="recover", help="Recupera um sinal por BPDN")
router.include_endpoint(recover)
