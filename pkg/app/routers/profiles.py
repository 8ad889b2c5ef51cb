"""
Router do subcomando profiles.
"""
from app.api.endpoints import profiles
from app.routers.base import CommandRouter

router = CommandRouter(name="profiles", help="Constrói perfis de sensor e verifica a isometria")
router.include_endpoint(profiles)
