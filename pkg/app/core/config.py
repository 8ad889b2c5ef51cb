import os
from dotenv import load_dotenv

load_dotenv()

class Settings:
    PROJECT_NAME: str = "Parallel CS Lab"
    PROJECT_DESCRIPTION: str = "Laboratório numérico de compressed sensing com aquisição paralela"
    PROJECT_VERSION: str = "1.0.0"

    ENVIRONMENT: str = os.getenv("ENVIRONMENT", "development")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "info")

    OUTPUT_DIR: str = os.getenv("PCS_OUTPUT_DIR", "results")
    WORKERS: int = int(os.getenv("PCS_WORKERS", "1"))
    MASTER_SEED: int = int(os.getenv("PCS_MASTER_SEED", "20160101"))

    @property
    def is_production(self) -> bool:
        return self.ENVIRONMENT.lower() == "production"

settings = Settings()
