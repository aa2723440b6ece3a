import logging
from typing import Callable

from recspec.cli.schemas import RunConfig
from recspec.settings import settings

LOG_FORMAT = "%(levelname)-5.5s [%(name)s] %(message)s"


def _setup_logging(level: str) -> None:
    """
    Configure the root logger once per process.

    Library modules only create named loggers; the command line decides
    where records go and at which level.

    :param level: level name such as INFO.
    """
    logging.basicConfig(format=LOG_FORMAT, level=level.upper(), force=True)


def startup(config: RunConfig) -> Callable[[], None]:
    """
    Actions to run before a command.

    :param config: the resolved run.
    :return: function that actually performs actions.
    """

    def _startup() -> None:
        _setup_logging(settings.log_level)
        if not config.dry_run:
            config.output_dir.mkdir(parents=True, exist_ok=True)

    return _startup


def shutdown(config: RunConfig) -> Callable[[], None]:
    """
    Actions to run after a command, whatever its outcome.

    :param config: the resolved run.
    :return: function that actually performs actions.
    """

    def _shutdown() -> None:
        logging.getLogger(__name__).debug("finished %s in %s", config.command, config.output_dir)
        logging.shutdown()

    return _shutdown
