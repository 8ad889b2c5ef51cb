"""
Router do subcomando coherence.
"""
from app.api.endpoints import coherence
from app.routers.base import CommandRouter

router = CommandRouter(name="coherence", help="Calcula coerências do ensemble e do sistema")
router.include_endpoint(coherence)
