
import logging

FILE_FORMAT = '%(asctime)s:%(levelname)s: %(message)s'


def set_logger(log_path, name='thlpu'):
    """Set the logger to log info in terminal and file `log_path`.
    ```
    logger = set_logger('data/logs/bench-201017-1200.log')
    logger.info("Starting grid...")
    ```
    Args:
        log_path: (string) where to log
        name: (string) logger to configure, the package root by default
    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.INFO)
    logger.propagate = False

    # Avoid duplicated lines when the grid runner is created twice in a session
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    # Logging to a file
    file_handler = logging.FileHandler(log_path)
    file_handler.setFormatter(logging.Formatter(FILE_FORMAT))
    logger.addHandler(file_handler)

    # Logging to console
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(logging.Formatter('%(message)s'))
    logger.addHandler(stream_handler)

    return logger
