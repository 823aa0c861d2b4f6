# job dispatch: one build_* handler per command
import logging

from commands.analysis import (
    build_beta_form, build_cyl_bound, build_cyl_experiment, build_energy, build_schwarz_integral,
    build_schwarz_pick, build_solve_cr,
)
from commands.geometry import build_classify, build_gauge, build_holonomy, build_rotnum, build_transport
from commands.plot import build_plot
from commands.spaces import build_check_space, build_construct, build_sheet_index
from util.jobs import COMMANDS, JobSpec, ResultEnvelope

logger = logging.getLogger(__name__)

HANDLERS = {
    'classify': build_classify,
    'transport': build_transport,
    'holonomy': build_holonomy,
    'rotnum': build_rotnum,
    'gauge': build_gauge,
    'check-space': build_check_space,
    'construct': build_construct,
    'sheet-index': build_sheet_index,
    'schwarz-integral': build_schwarz_integral,
    'solve-cr': build_solve_cr,
    'energy': build_energy,
    'beta-form': build_beta_form,
    'schwarz-pick': build_schwarz_pick,
    'cyl-bound': build_cyl_bound,
    'cyl-experiment': build_cyl_experiment,
    'plot': build_plot,
}
assert set(HANDLERS) == set(COMMANDS)


def run(job: JobSpec) -> ResultEnvelope:
    """Execute a validated job."""
    logger.info('running %s (inputs %s)', job.command, job.inputs_hash()[:12])
    return HANDLERS[job.command](job)
