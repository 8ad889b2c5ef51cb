#imports basicos

import logging
import sys

from app.core.config import settings
from app.main import main

logger = logging.getLogger(__name__)


if __name__ == "__main__":
    logger.debug(f"Iniciando {settings.PROJECT_NAME} ({settings.ENVIRONMENT})...")
    sys.exit(main())
