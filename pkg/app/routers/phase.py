"""
Router do subcomando phase.
"""
from app.api.endpoints import phase
from app.routers.base import CommandRouter

router = CommandRouter(name="phase", help="Executa a transição de fase (δ, κ)")
router.include_endpoint(phase)
