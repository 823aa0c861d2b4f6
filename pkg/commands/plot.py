# render a saved envelope's payload to SVG
import logging
from pathlib import Path

from ui_components.plots import figure_for_payload, write_svg
from util.hyperbolic import PreconditionError
from util.jobs import JobSpec, ResultEnvelope
from util.storage import load_envelope

logger = logging.getLogger(__name__)


def build_plot(job: JobSpec) -> ResultEnvelope:
    source = Path(job.params['envelope'])
    envelope = load_envelope(source)
    if envelope is None:
        raise PreconditionError(f'cannot read envelope {source}')
    target = Path(job.params.get('output') or source.with_suffix('.svg'))
    try:
        write_svg(figure_for_payload(envelope.payload), target)
    except (OSError, ValueError, RuntimeError) as e:
        # kaleido reports a missing or broken renderer as ValueError or RuntimeError
        raise PreconditionError(f'cannot render {target}: {e}') from e
    outputs = {'svg': str(target), 'source_command': envelope.command, 'kind': envelope.payload['kind']}
    return ResultEnvelope.for_job(job, outputs, {'source_hash': envelope.inputs_hash})
