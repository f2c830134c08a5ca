from .utils.logger import logger  # noqa: F401
