import pytest

from sddekit.errors import ConfigError
from sddekit.main.forms.experiment_forms import (
    KINDS,
    MISSING_KEY_ERROR_MESSAGE,
    NOT_ON_GRID_ERROR_MESSAGE,
    UNKNOWN_KEY_ERROR_MESSAGE,
    load_experiment,
    parse_experiment,
)


def couple_document(**estimator):
    return {
        'kind': 'couple',
        'model': {'id': 'holder-drift'},
        'grid': {'dt': 0.01, 'r': 0.5},
        'estimator': dict({'y0': 0.0, 'h': 1.0}, **estimator),
    }


class TestParseExperiment(object):

    def test_defaults_are_filled(self):
        experiment = parse_experiment(couple_document())

        assert experiment.kind == 'couple'
        assert experiment.model_params == {}
        assert experiment.master_seed == 0
        assert experiment.output_path is None
        assert experiment.estimator['coupling'] == 'controlled'
        assert experiment.estimator['gain'] is None
        assert experiment.estimator['x0'] == 1.0

    def test_state_lists_are_kept(self):
        experiment = parse_experiment(couple_document(x0=[1, 2], y0=[0.5]))
        assert experiment.estimator['x0'] == [1.0, 2.0]
        assert experiment.estimator['y0'] == 0.5

    @pytest.mark.parametrize('document, field', [
        ({'kind': 'couple', 'extra': 1}, 'extra'),
        ({'grid': {'dt': 0.1, 'r': 1.0}}, 'kind'),
        ({'kind': 'nope'}, 'kind'),
    ])
    def test_top_level_errors(self, document, field):
        with pytest.raises(ConfigError) as e:
            parse_experiment(document)
        assert e.value.field == field

    @pytest.mark.parametrize('estimator, field, message', [
        ({'y0': 0.0, 'h': 1.0, 'bogus': 1}, 'estimator.bogus', UNKNOWN_KEY_ERROR_MESSAGE),
        ({'y0': 0.0}, 'estimator.h', MISSING_KEY_ERROR_MESSAGE),
        ({'y0': 0.0, 'h': 0.015}, 'estimator.h', NOT_ON_GRID_ERROR_MESSAGE),
        ({'y0': 0.0, 'h': 1.0, 'paths': 1.5}, 'estimator.paths', None),
        ({'y0': 0.0, 'h': 1.0, 'paths': True}, 'estimator.paths', None),
        ({'y0': 0.0, 'h': 1.0, 'gamma': -0.5}, 'estimator.gamma', None),
        ({'y0': 0.0, 'h': 1.0, 'law': 'cubic'}, 'estimator.law', None),
        ({'y0': 'a', 'h': 1.0}, 'estimator.y0', None),
    ])
    def test_estimator_errors(self, estimator, field, message):
        document = couple_document()
        document['estimator'] = estimator
        with pytest.raises(ConfigError) as e:
            parse_experiment(document)

        assert e.value.field == field
        if message:
            assert message in str(e.value)

    def test_grid_r_must_be_on_the_grid(self):
        document = couple_document()
        document['grid']['r'] = 0.505
        with pytest.raises(ConfigError) as e:
            parse_experiment(document)
        assert e.value.field == 'grid.r'

    def test_simulate_needs_a_horizon(self):
        with pytest.raises(ConfigError) as e:
            parse_experiment({'kind': 'simulate', 'model': {'id': 'linear-delay'}, 'grid': {'dt': 0.1, 'r': 1.0}})
        assert e.value.field == 'grid.horizon'

    def test_tailcheck_needs_no_model(self):
        experiment = parse_experiment({
            'kind': 'tailcheck',
            'grid': {'dt': 0.01, 'r': 0.01},
            'estimator': {'driver': 'deterministic', 'R_grid': [0.5, 1]},
        })
        assert experiment.model_id is None
        assert experiment.estimator['R_grid'] == [0.5, 1.0]

    def test_seed_range(self):
        document = couple_document()
        document['seeds'] = {'master': -1}
        with pytest.raises(ConfigError) as e:
            parse_experiment(document)
        assert e.value.field == 'seeds.master'

    def test_every_kind_is_known(self):
        assert 'lyapunov' in KINDS and len(KINDS) == 8


class TestExperimentConfig(object):

    def test_hash_covers_the_effective_document(self):
        explicit = couple_document(coupling='controlled')
        assert parse_experiment(couple_document()).config_hash == parse_experiment(explicit).config_hash
        assert parse_experiment(couple_document()).config_hash != parse_experiment(couple_document(gamma=0.3)).config_hash

    def test_seed_override(self):
        experiment = parse_experiment(couple_document()).with_overrides(master_seed=9)
        assert experiment.master_seed == 9
        assert experiment.with_overrides() is experiment

        with pytest.raises(ConfigError):
            experiment.with_overrides(master_seed=2 ** 64)


class TestLoadExperiment(object):

    def test_invalid_yaml(self, tmpdir):
        path = tmpdir.join('broken.yaml')
        path.write('kind: [couple')
        with pytest.raises(ConfigError) as e:
            load_experiment(str(path))
        assert e.value.field == '<root>'

    def test_not_a_mapping(self, tmpdir):
        path = tmpdir.join('list.yaml')
        path.write('- 1\n- 2\n')
        with pytest.raises(ConfigError):
            load_experiment(str(path))
