"""
Router do subcomando certificate.
"""
from app.api.endpoints import certificate
from app.routers.base import CommandRouter

router = CommandRouter(name="certificate", help="Constrói e verifica o certificado dual por golfe")
router.include_endpoint(certificate)
