from datetime import datetime, timedelta

import numpy as np
import pytest

from fbmpower.pipeline import RawSeries


@pytest.fixture
def make_series():
    """Build a RawSeries with hourly timestamps from a value sequence."""

    def build(values, building="b1", quantity="P", start="2024-01-01T00:00:00"):
        t0 = datetime.fromisoformat(start)
        stamps = tuple(t0 + timedelta(hours=k) for k in range(len(values)))
        return RawSeries(
            building_id=building,
            quantity=quantity,
            timestamps=stamps,
            values=np.asarray(values, dtype=float),
        )

    return build
