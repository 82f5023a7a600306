from ...helpers import BaseApplicationTest


class TestTailcheck(BaseApplicationTest):

    def test_deterministic_driver_never_exceeds(self):
        document = self.experiment_document(
            'tailcheck', {'driver': 'deterministic', 'paths': 10, 'A': 1.0, 'lam': 2.0, 'v0': 3.0,
                          'R_grid': [0.1, 0.5, 1.0]},
            model_id=None, dt=0.01, r=0.01,
        )
        result = self.run_experiment(document)

        assert result.exit_code == 0, result.output
        header, rows = self.result_rows(result.output.strip())
        assert header == ['R', 'threshold', 'frequency', 'n_paths', 'n_discarded']
        assert [row[2] for row in rows] == ['0', '0', '0']
        assert all(row[3:] == ['10', '0'] for row in rows)

    def test_squared_ou_frequencies_fall(self):
        document = self.experiment_document(
            'tailcheck', {'driver': 'squared-ou', 'paths': 2000, 'cap': 25.0, 'R_grid': [0.0, 0.2, 0.4]},
            model_id=None, dt=0.01, r=0.01,
        )
        result = self.run_experiment(document)

        assert result.exit_code == 0, result.output
        _, rows = self.result_rows(result.output.strip())
        frequencies = [float(row[2]) for row in rows]
        assert frequencies == sorted(frequencies, reverse=True)
        assert frequencies[0] > frequencies[-1]

    def test_unknown_driver(self):
        document = self.experiment_document('tailcheck', {'driver': 'cubic', 'R_grid': [1.0]}, model_id=None)
        result = self.run_experiment(document)

        assert result.exit_code == 2
        assert 'estimator.driver' in result.output
