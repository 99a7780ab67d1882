"""Tests for domain services."""

import pytest

from twistsha.domain.errors import InvalidInputError, SignConditionError
from twistsha.domain.interfaces import CoefficientStore, FactsSource
from twistsha.domain.models import FactsFile, FormId, ShaConclusion
from twistsha.domain.qseries import QSeries
from twistsha.domain.services import CertificationService, CoefficientService


@pytest.fixture
def mock_store(mocker):
    """Mock coefficient store."""
    return mocker.Mock(spec=CoefficientStore)


@pytest.fixture
def mock_facts_source(mocker):
    """Mock facts source."""
    source = mocker.Mock(spec=FactsSource)
    source.load.return_value = FactsFile()
    return source


@pytest.fixture
def coefficient_service(mock_store):
    """Creates coefficient service with a mocked store."""
    return CoefficientService(mock_store)


class TestCoefficientService:
    """Tests for CoefficientService."""

    def test_series_from_store(self, coefficient_service, mock_store, mocker):
        """Tests that a stored expansion is served without recomputation."""
        # Setup
        stored = QSeries([0, 1, 0, 0, -56], 4)
        mock_store.load.return_value = stored
        generate = mocker.patch("twistsha.domain.services.forms.generate")

        # Execute
        result = coefficient_service.series(FormId.KOHNEN_LIFT, 4)

        # Verify
        assert result == stored
        mock_store.load.assert_called_once_with(FormId.KOHNEN_LIFT, 4)
        generate.assert_not_called()
        mock_store.save.assert_not_called()

    def test_series_generated_and_saved(self, coefficient_service, mock_store):
        """Tests that a miss computes and stores the expansion."""
        # Setup
        mock_store.load.return_value = None

        # Execute
        result = coefficient_service.series(FormId.DELTA, 3)

        # Verify
        assert result.to_integers() == [0, 1, -24, 252]
        mock_store.save.assert_called_once_with(FormId.DELTA, result)

    def test_rational_series_bypass_store(self, coefficient_service, mock_store):
        """Tests that g4 is never stored."""
        coefficient_service.series(FormId.G4, 3)

        mock_store.load.assert_not_called()
        mock_store.save.assert_not_called()

    def test_plus_coeff(self, coefficient_service, mock_store):
        """Tests coefficient lookup through the lift."""
        mock_store.load.return_value = None

        assert coefficient_service.plus_coeff(517).value == 52000080
        with pytest.raises(InvalidInputError):
            coefficient_service.plus_coeff(0)

    def test_table(self):
        """Tests the factored table row for i=3 at p=11."""
        rows = CoefficientService().table(11, 3, 3)

        assert len(rows) == 1
        assert rows[0].n == 33
        assert rows[0].value == -6480
        assert rows[0].factored == "-6480=-2^4·3^4·5"

    def test_table_zero_rows(self):
        """Tests rows outside the plus space."""
        rows = CoefficientService().table(11, 2, 8)

        assert [row.i for row in rows] == [2, 3, 4, 5, 6, 7, 8]
        assert [row.factored for row in rows if row.value == 0] == ["0", "0", "0"]

    @pytest.mark.parametrize(("i_from", "i_to"), [(0, 3), (4, 3)])
    def test_table_rejects_bad_range(self, i_from, i_to):
        """Tests range validation."""
        with pytest.raises(InvalidInputError):
            CoefficientService().table(11, i_from, i_to)

    def test_context_for_delta(self):
        """Tests that a_p is read from the expansion."""
        ctx = CoefficientService().context(11, 517)

        assert ctx.a_p == 534612
        assert ctx.k == 12
        assert ctx.level == 1

    def test_context_rejects_wrong_a_p(self):
        """Tests that a supplied a_p must agree with tau(p)."""
        service = CoefficientService()

        assert service.context(11, 517, a_p=534612).a_p == 534612
        with pytest.raises(ValueError):
            service.context(11, 517, a_p=1)

    def test_context_for_level_eleven(self):
        """Tests the weight-2 newform."""
        ctx = CoefficientService().context(5, -4, FormId.X0_11)

        assert ctx.a_p == 1
        assert ctx.level == 11

    def test_context_for_custom_form(self):
        """Tests contexts given by weight, level and a_p."""
        service = CoefficientService()
        ctx = service.context(7, 5, None, k=14, level=1, a_p=1)

        assert ctx.label == "k14N1"
        with pytest.raises(InvalidInputError):
            service.context(7, 5, None, k=14)
        with pytest.raises(InvalidInputError):
            service.context(7, 5, FormId.G4)


class TestCertificationService:
    """Tests for CertificationService."""

    def test_facts_loaded_once(self, mock_facts_source):
        """Tests that the facts source is read lazily and once."""
        # Setup
        coefficients = CoefficientService()
        service = CertificationService(coefficients, mock_facts_source)
        ctx = coefficients.context(11, 517)

        # Execute
        service.check(ctx)
        service.check(ctx)

        # Verify
        mock_facts_source.load.assert_called_once()

    def test_without_facts_source(self):
        """Tests that a missing source means no facts."""
        service = CertificationService(CoefficientService(), None)

        assert len(service.facts) == 0

    def test_ratio(self, mock_facts_source):
        """Tests the ratio certificate for D=517, D'=33."""
        service = CertificationService(CoefficientService(), mock_facts_source)

        cert = service.ratio(11, 517, 33)

        assert cert.valuation == 2
        assert cert.conclusion is ShaConclusion.SHA_D_NONTRIVIAL
        assert cert.tamagawa_term_d is None
        assert len(cert.assumptions) == 2

    def test_ratio_rejects_negative_discriminant(self, mock_facts_source):
        """Tests the sign condition."""
        service = CertificationService(CoefficientService(), mock_facts_source)

        with pytest.raises(SignConditionError):
            service.ratio(11, -11, 33)

    def test_scan(self, mock_facts_source):
        """Tests that scans reuse the coefficient service."""
        service = CertificationService(CoefficientService(), mock_facts_source)

        rows = service.scan(11, 50)

        assert [row.discriminant for row in rows] == [33, 44]
        with pytest.raises(InvalidInputError):
            service.scan(11, 0)
