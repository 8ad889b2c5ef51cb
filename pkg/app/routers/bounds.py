"""
Router do subcomando bounds.
"""
from app.api.endpoints import bounds
from app.routers.base import CommandRouter

router = CommandRouter(name="bounds", help="Avalia as cotas de número de medições")
router.include_endpoint(bounds)
