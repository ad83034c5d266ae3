import argparse
import copy
import logging
import os
import sys
import time
import traceback
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor

from duhive.runners import jobs as job_lib
from duhive.runners.report import FORMATS, JobReport, JobResult, ReportBundle, emit
from duhive.runners.utils import load_config
from duhive.utils import loggers, utils
from duhive.utils.experiment import Experiment
from duhive.utils.registry import ConfigError, get_parsed_args


class Runner:
    """Runs the jobs of a config and writes their report.

    Jobs are independent, so with more than one worker they run on a thread pool.
    The report keeps the order of the config regardless of completion order.
    """

    def __init__(
        self,
        jobs,
        logger,
        experiment_manager,
        run_name,
        config,
        workers=1,
        formats=FORMATS,
    ):
        """
        Args:
            jobs (list[Job]): Jobs to run, with unique names.
            logger (Logger): Logger receiving the metrics of every job.
            experiment_manager (Experiment): Output folder of the run.
            run_name (str): Name of the run.
            config (dict): Expanded config echoed in the manifest.
            workers (int): Number of jobs running at the same time.
            formats (tuple[str]): Report formats, any of "csv" and "json".
        """
        self._jobs = jobs
        self._logger = logger
        self._experiment_manager = experiment_manager
        self._run_name = run_name
        self._config = config
        self._workers = workers
        self._formats = tuple(formats)

    def run_job(self, index, job):
        """Runs one job. Exceptions are recorded in the report instead of raised."""
        logging.info("Running job %s (%s)", job.name, job.kind)
        start = time.perf_counter()
        try:
            result = job.run(self._logger, f"jobs.{index}")
            status, error = "ok", None
        except Exception as exc:
            result, status = JobResult(), "error"
            error = f"{type(exc).__name__}: {exc}"
            logging.error("Job %s failed\n%s", job.name, traceback.format_exc())
        runtime = time.perf_counter() - start
        report = JobReport(job.name, job.kind, status, runtime, result, error)
        failed = [claim.name for claim in result.claims if not claim.passed]
        if failed:
            logging.warning("Job %s failed claims: %s", job.name, ", ".join(failed))
        return report

    def run(self):
        """Runs every job, writes the report and saves the experiment.

        Returns:
            ReportBundle
        """
        if self._workers > 1:
            with ThreadPoolExecutor(max_workers=self._workers) as executor:
                futures = [
                    executor.submit(self.run_job, index, job)
                    for index, job in enumerate(self._jobs)
                ]
                reports = [future.result() for future in futures]
        else:
            reports = [self.run_job(index, job) for index, job in enumerate(self._jobs)]
        bundle = ReportBundle(self._run_name, self._config, reports)
        emit(bundle, self._experiment_manager.dir_name, self._formats)
        self._experiment_manager.save()
        logging.info(
            "Run %s finished: %d/%d jobs passed",
            self._run_name,
            sum(report.passed for report in reports),
            len(reports),
        )
        return bundle


def _unique_names(jobs):
    seen = {}
    for job in jobs:
        count = seen.get(job.name, 0)
        seen[job.name] = count + 1
        if count:
            job.name = f"{job.name}_{count}"
    return jobs


def set_up_run(config, kinds=None):
    """Returns a :py:class:`Runner` object based on the config and any command line
    arguments.

    Every job is built before anything runs, so a malformed config fails with a
    :py:class:`ConfigError` naming the field.

    Args:
        config (dict): Configuration of the run.
        kinds (list[str]): Only run jobs of these kinds.
    """
    args = get_parsed_args(
        {
            "seed": int,
            "run_name": str,
            "save_dir": str,
            "memory_budget": int,
            "workers": int,
        }
    )
    config.update(args)
    full_config = utils.Chomp(copy.deepcopy(config))

    if "seed" in config:
        utils.seeder.set_global_seed(config["seed"])
    utils.set_memory_budget(config.get("memory_budget"))

    # Set up loggers
    logger_config = config.get("loggers", {"name": "NullLogger"})
    if logger_config is None or len(logger_config) == 0:
        logger_config = {"name": "NullLogger"}
    if isinstance(logger_config, list):
        logger_config = {
            "name": "CompositeLogger",
            "kwargs": {"logger_list": logger_config},
        }
    logger_fn, full_config["loggers"] = loggers.get_logger(logger_config, "loggers")
    logger = logger_fn()

    # Set up jobs
    job_configs = config.get("jobs")
    if job_configs is None:
        raise ConfigError("jobs", "missing list of jobs")
    if isinstance(job_configs, (str, Mapping)) or not isinstance(job_configs, Sequence):
        raise ConfigError("jobs", "expected a list of job configs")
    jobs = []
    full_config["jobs"] = []
    for index, job_config in enumerate(job_configs):
        job_fn, expanded = job_lib.get_job(job_config, f"jobs.{index}")
        full_config["jobs"].append(expanded)
        job = job_fn()
        if kinds and job.kind not in kinds:
            continue
        jobs.append(job)
    _unique_names(jobs)

    run_name = config.get("run_name", "duhive_run")
    save_dir = os.path.join(config.get("save_dir", "experiment"), run_name)
    experiment_manager = Experiment(save_dir)
    experiment_manager.register_experiment(config=full_config, logger=logger)
    return Runner(
        jobs,
        logger,
        experiment_manager,
        run_name,
        dict(full_config),
        config.get("workers", 1),
        config.get("formats", FORMATS),
    )


def run_config(path=None, preset_config=None, kinds=None):
    """Loads a config file and runs it.

    Returns:
        ReportBundle
    """
    config = load_config(path, preset_config)
    return set_up_run(config, kinds).run()


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("-c", "--config")
    parser.add_argument("-p", "--preset-config")
    parser.add_argument("-j", "--jobs-config")
    parser.add_argument("-l", "--logger-config")
    parser.add_argument(
        "-k",
        "--kind",
        action="append",
        choices=sorted(job_lib.JOB_KINDS),
        help="Only run jobs of this kind. Can be repeated.",
    )
    args, _ = parser.parse_known_args()
    if args.config is None and args.preset_config is None:
        raise ValueError("Config needs to be provided")
    logging.basicConfig(level=logging.INFO)
    config = load_config(
        args.config,
        args.preset_config,
        args.jobs_config,
        args.logger_config,
    )
    bundle = set_up_run(config, args.kind).run()
    sys.exit(0 if bundle.passed else 1)


if __name__ == "__main__":
    main()
