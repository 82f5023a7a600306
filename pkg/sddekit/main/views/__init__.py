from . import approx_study, couple, ergodic, lyapunov, sensitivity, simulate, support_probe, tailcheck


EXPERIMENT_VIEWS = {
    'simulate': simulate.simulate,
    'couple': couple.couple,
    'approx-study': approx_study.approx_study,
    'support-probe': support_probe.support_probe,
    'ergodic': ergodic.ergodic,
    'sensitivity': sensitivity.sensitivity,
    'tailcheck': tailcheck.tailcheck,
    'lyapunov': lyapunov.lyapunov,
}
