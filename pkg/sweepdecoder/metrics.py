import os

import statsd

metrics = statsd.StatsClient(os.getenv("STATSD_HOST", "localhost"), 8125,
                             prefix=os.getenv("RunEnv"))


def metric_key(*parts):
    return ".".join(["sweepdecoder", *[str(p) for p in parts]])
