from .network import (accuracy, as_objective, confusion, flatten,  # noqa
                      forward, predict, rmse_loss, unflatten)
