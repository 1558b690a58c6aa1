import logging
from src.config import BASIC_LOGS_FILE, LOG_LEVEL, MAX_BYTES_PER_FILE, BACKUP_FILES
from logging.handlers import RotatingFileHandler


def _attach_handler(logger: logging.Logger, file: str, max_bytes: int, backup_files: int, fmt: str):
    # One handler per logger name, whatever the number of wrapper instances
    if logger.handlers:
        return
    if file:
        handler = RotatingFileHandler(file, maxBytes=max_bytes, backupCount=backup_files)
    else:
        handler = logging.StreamHandler()
    handler.setLevel(LOG_LEVEL)
    handler.setFormatter(logging.Formatter(fmt))
    logger.addHandler(handler)
    logger.propagate = False


class ExperimentLogHandler:
    """
    Trace of the experiment lifecycle, one line per event as "<direction> -> <message>" where direction is one of
    START, DONE, SWEEP, VERIFY or WRITE.
    """

    def __init__(self, file=BASIC_LOGS_FILE, max_bytes=MAX_BYTES_PER_FILE, backup_files=BACKUP_FILES):
        self.__logger = logging.getLogger("banditsim.experiment")
        self.__logger.setLevel(LOG_LEVEL)
        _attach_handler(self.__logger, file, max_bytes, backup_files, '%(asctime)s - %(message)s')

    def add_log(self, direction: str, message: str):
        self.__logger.info(f"{direction} -> {message}")


class AppLogHandler:
    def __init__(self, file=BASIC_LOGS_FILE, max_bytes=MAX_BYTES_PER_FILE, backup_files=BACKUP_FILES):
        self.__logger = logging.getLogger("banditsim")
        self.__logger.setLevel(LOG_LEVEL)
        _attach_handler(self.__logger, file, max_bytes, backup_files, '%(asctime)s - %(levelname)s - %(message)s')

    def add_info_log(self, message: str):
        self.__logger.info(message)

    def add_warning_log(self, message: str):
        self.__logger.warning(message)

    def add_error_log(self, message: str):
        self.__logger.error(message)
