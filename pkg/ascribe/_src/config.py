__default_conf = {
    "max_depth": 5,  # deepest viewpoint or attitude nesting accepted
    "max_steps": 8,  # planner step bound (iterative deepening stops here)
    "max_nodes": 200_000,  # planner node budget before LimitExceeded
    "default_library": True,  # runner stores start with the shipped act library
}

__conf = __default_conf.copy()


def config(name, value=None):
    if value is None:
        if name not in __conf:
            raise ValueError("Unknown configuration option: {}".format(name))
        return __conf[name]

    if name in __conf:
        __conf[name] = value
    else:
        raise ValueError("Unknown configuration option: {}".format(name))


def _resolve(name, value):
    """Explicit keyword wins, otherwise the global option."""
    if value is None:
        return config(name)
    return value
