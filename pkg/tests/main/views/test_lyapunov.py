from ...helpers import BaseApplicationTest


class TestLyapunov(BaseApplicationTest):

    def test_dissipative_model_passes_at_every_start_state(self):
        document = self.experiment_document(
            'lyapunov', {'paths': 500, 'probes': [2.0, 4.0]},
            model_id='prop-kappa', params={'kappa': 1.0}, dt=0.01, r=0.5,
        )
        result = self.run_experiment(document)

        assert result.exit_code == 0, result.output
        header, rows = self.result_rows(result.output.strip())
        assert header == ['probe', 'x0', 'case', 'V_x', 'drift', 'ci_halfwidth', 'bound', 'passes']
        assert [row[:3] for row in rows] == [['0', '2', 'i'], ['1', '4', 'i']]
        assert all(row[-1] == 'true' for row in rows)

    def test_bounded_drift_needs_its_constants(self):
        document = self.experiment_document(
            'lyapunov', {'paths': 10, 'probes': [1.0], 'kappa': -1.0},
            model_id='prop-kappa', params={'kappa': -1.0}, dt=0.01, r=0.5,
        )
        result = self.run_experiment(document)

        assert result.exit_code == 1
        assert 'kappa = -1 needs' in result.output

    def test_drift_stays_below_the_bound_far_from_the_origin(self):
        document = self.experiment_document(
            'lyapunov', {'paths': 10_000, 'probes': [2.0, 4.0, 8.0]},
            model_id='prop-kappa', params={'kappa': 1.0}, dt=0.01, r=0.5,
        )
        result = self.run_experiment(document)

        assert result.exit_code == 0, result.output
        header, rows = self.result_rows(result.output.strip())
        drift, bound = header.index('drift'), header.index('bound')
        assert [row[1] for row in rows] == ['2', '4', '8']
        assert all(row[-1] == 'true' for row in rows)
        assert all(float(row[drift]) <= float(row[bound]) for row in rows)
        assert float(rows[-1][drift]) < float(rows[-1][bound]) < 0
