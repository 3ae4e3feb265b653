"""Smoke test for the mfcontrol Python module.

Build and install first:  pip install --no-build-isolation crates/python
"""
import math
import tempfile
from pathlib import Path

import mfcontrol


def main():
    names = mfcontrol.list_scenarios()
    assert len(names) == 10 and "heatex_ipi" in names, names

    log = mfcontrol.run("fig01_friction_ipi")
    assert log.columns()[:6] == ["t", "y", "y_ref", "u", "f_hat", "e"]
    assert len(log) == len(log["t"]) == 1000
    m = log.metrics(span=1.0)
    assert m["rms_error"] < 0.02, m

    sc = mfcontrol.Scenario.builtin("mass_spring_ipi_noise")
    assert sc.run().to_csv() == sc.run().to_csv()
    assert sc.with_seed(3).run().to_csv() != sc.run().to_csv()
    again = mfcontrol.Scenario.from_toml(sc.to_toml())
    assert again.name == sc.name and again.plant == "mass_spring"

    k_p, k_i = mfcontrol.pi_equivalent_gains(2.0, 0.01, 16.0)
    assert math.isclose(k_p, -50.0) and math.isclose(k_i, -800.0)
    assert mfcontrol.ipi_control(1.0, 2.0, 16.0, 0.0, 0.5) == -4.5
    assert math.isclose(mfcontrol.smooth_step(10.0, 0.0, 20.0, 270.0, 600.0), 270.0 + 330.0 * 27 / 64)

    try:
        mfcontrol.run("vehicle_ipi")
    except mfcontrol.DivergenceError as e:
        print("vehicle_ipi:", e)
    try:
        mfcontrol.Scenario.from_toml(sc.to_toml().replace("alpha = 2.0", "alpha = 0.0"))
        raise AssertionError("alpha = 0 accepted")
    except mfcontrol.ScenarioFileError:
        pass

    with tempfile.TemporaryDirectory() as d:
        files = mfcontrol.Scenario.builtin("heatex_ipi").run_to_dir(d)
        assert sorted(Path(f).name for f in files) == [
            "heatex_ipi.csv", "heatex_ipi_control.svg", "heatex_ipi_output.svg"]
    print("python smoke test ok")


if __name__ == "__main__":
    main()
