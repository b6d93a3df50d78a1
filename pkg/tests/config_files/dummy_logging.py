DELTA_GRID = '0,1'
DICT_CONFIG = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'solver': {'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'},
    },
    'handlers': {
        'discard': {'class': 'logging.NullHandler', 'formatter': 'solver'},
    },
    'loggers': {
        'locdisc': {'handlers': ['discard'], 'level': 'INFO'},
    },
}
