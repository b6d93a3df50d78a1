SEED = 7
RESTARTS = 3
DELTA_GRID = '0:0.5:1'
FORMAT = 'json'
