"""
Configuration and constants for sqpack.
"""
import os
from fractions import Fraction

from dotenv import load_dotenv

load_dotenv()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class Settings:
    """Solver settings loaded from environment variables."""

    # Bench parallelism
    SQPACK_THREADS: int = int(os.getenv("SQPACK_THREADS", os.cpu_count() or 1))

    # Logging
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()

    # PTAS
    DEFAULT_EPS: Fraction = Fraction(os.getenv("SQPACK_DEFAULT_EPS", "1/4"))

    # Exact oracle budgets
    EXACT_MAX_ITEMS: int = int(os.getenv("SQPACK_EXACT_MAX_ITEMS", 9))
    EXACT_NODE_BUDGET: int = int(os.getenv("SQPACK_EXACT_NODE_BUDGET", 2_000_000))
    EXACT_TIME_BUDGET: float = float(os.getenv("SQPACK_EXACT_TIME_BUDGET", 60))

    # Generators
    GEN_MAX_DENOMINATOR: int = int(os.getenv("SQPACK_GEN_MAX_DENOMINATOR", 10**6))

    # Rendering (drawing units per bin side)
    SVG_BIN_SIDE: int = int(os.getenv("SQPACK_SVG_BIN_SIDE", 1000))
    SVG_BIN_GAP: int = int(os.getenv("SQPACK_SVG_BIN_GAP", 100))
    PNG_BIN_SIDE: int = int(os.getenv("SQPACK_PNG_BIN_SIDE", 400))

    @classmethod
    def validate(cls) -> None:
        """Validate configuration on startup."""
        invalid = []

        if cls.SQPACK_THREADS < 1:
            invalid.append("SQPACK_THREADS")
        if cls.LOG_LEVEL not in LOG_LEVELS:
            invalid.append("LOG_LEVEL")
        if cls.DEFAULT_EPS.numerator != 1 or cls.DEFAULT_EPS.denominator < 4:
            invalid.append("SQPACK_DEFAULT_EPS")
        if cls.EXACT_MAX_ITEMS < 1:
            invalid.append("SQPACK_EXACT_MAX_ITEMS")
        if cls.EXACT_NODE_BUDGET < 1:
            invalid.append("SQPACK_EXACT_NODE_BUDGET")
        if cls.EXACT_TIME_BUDGET <= 0:
            invalid.append("SQPACK_EXACT_TIME_BUDGET")
        if not 1 <= cls.GEN_MAX_DENOMINATOR <= 10**6:
            invalid.append("SQPACK_GEN_MAX_DENOMINATOR")
        if min(cls.SVG_BIN_SIDE, cls.PNG_BIN_SIDE) < 1 or cls.SVG_BIN_GAP < 0:
            invalid.append("SQPACK_SVG_BIN_SIDE/SQPACK_SVG_BIN_GAP/SQPACK_PNG_BIN_SIDE")

        if invalid:
            raise ValueError(
                f"Invalid environment variables: {', '.join(invalid)}. "
                "Please check your .env file."
            )


settings = Settings()
