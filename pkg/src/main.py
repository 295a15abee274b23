#!/usr/bin/env python3

import functools
import json
import logging
import sys
import click
from yaspin import yaspin

from errors import RopError, ParseError
from logger import log_init
from models import MetaMethodSpec, MetaMethods, RunConfig, SimConfig, VoteNull
from models.simulation import InferenceRoute
from state_machine_modular import StateMachineModular

def handle_errors(command):
  """Print RopError messages and exit with their category code"""
  @functools.wraps(command)
  def wrapper(*args, **kwargs):
    try:
      return command(*args, **kwargs)
    except RopError as error:
      click.echo(f"Error: {error}", err=True)
      sys.exit(error.exit_code)
  return wrapper

def load_json_config(path):
  if not path:
    return {}
  try:
    with open(path, "r", encoding="utf-8") as file:
      return json.load(file)
  except FileNotFoundError:
    raise ParseError("file not found", path)
  except json.JSONDecodeError as error:
    raise ParseError(error.msg, path, line=error.lineno, column=error.colno)

def parse_int_list(text):
  """'1-10' or '5,6,7' -> list of integers"""
  values = []
  for part in text.split(","):
    part = part.strip()
    if "-" in part:
      start, end = part.split("-", 1)
      values.extend(range(int(start), int(end) + 1))
    elif part:
      values.append(int(part))
  return values

def input_options(command):
  """Options shared by the commands that read p-values or studies"""
  options = [
    click.option('--config', 'config_path', type=click.Path(), help='JSON run configuration; flags override it'),
    click.option('--pvalues', type=click.Path(), help='Genes x studies p-value TSV'),
    click.option('--opposite', type=click.Path(), help='Opposite-tail p-value TSV for one-sided input'),
    click.option('--expression', multiple=True, type=click.Path(), help='Study expression TSV (repeatable)'),
    click.option('--labels', multiple=True, type=click.Path(), help='Labels file for each --expression'),
    click.option('--one-sided', is_flag=True, default=None, help='Compute left/right one-sided p-values'),
    click.option('--fdr', type=float, help='FDR level (default 0.05)'),
    click.option('--seed', type=int, help='Seed for every random draw (default 0)'),
    click.option('--gmt', type=click.Path(), help='Gene sets for the pathway criterion'),
    click.option('--min-size', type=int, help='Smallest gene set kept (default 5)'),
    click.option('--max-size', type=int, help='Largest gene set kept (default 500)'),
    click.option('--top-u', type=int, help='Pathway committee size U (default 100)'),
    click.option('--wilcoxon-sides', type=click.Choice(['one', 'two']), help='Sequential test direction'),
    click.option('--baseline-permutations', type=int, help='P-value shuffles for the count criterion (default 100)'),
    click.option('--processes', type=int, help='Worker processes for permutations'),
    click.option('--outdir', '-o', type=click.Path(), help='Output directory'),
  ]
  for option in reversed(options):
    command = option(command)
  return command

def build_run_config(config_path, method_flags, **flags):
  """Merge the JSON configuration with the flags that were given"""
  data = load_json_config(config_path)
  keys = {
    'pvalues': 'pvalue_path', 'opposite': 'opposite_pvalue_path', 'one_sided': 'one_sided',
    'fdr': 'fdr', 'seed': 'seed', 'gmt': 'gene_set_path', 'min_size': 'min_set_size',
    'max_size': 'max_set_size', 'top_u': 'top_u', 'baseline_permutations': 'n_baseline_permutations',
    'processes': 'processes', 'outdir': 'output_dir', 'route': 'route', 'permutations': 'n_permutations',
    'auto_r': 'auto_select_r',
  }
  for flag, key in keys.items():
    if flags.get(flag) is not None:
      data[key] = flags[flag]
  if flags.get('expression'):
    data['expression_paths'] = list(flags['expression'])
    data['label_paths'] = list(flags.get('labels') or [])
  if flags.get('wilcoxon_sides'):
    data['wilcoxon_sides'] = 'right' if flags['wilcoxon_sides'] == 'one' else 'two'
  method = merge_method(data.get('method'), method_flags)
  if method is not None:
    data['method'] = method
  data.setdefault('output_dir', 'rop_output')
  return RunConfig.from_dict(data)

def merge_method(configured, overrides):
  """
  Apply method flags on top of the configured method dict

  Flags left unset keep the configured values; naming a different method
  starts from that method alone. A dict without a method name means rOP.
  """
  overrides = {key: value for key, value in overrides.items() if value is not None}
  method = dict(configured or {})
  if 'method' in overrides:
    overrides['method'] = MetaMethods.normalize(overrides['method'])
    if MetaMethods.normalize(method.get('method', MetaMethods.ROP)) != overrides['method']:
      method = {}
  method.update(overrides)
  return method or None

@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Show debug messages')
def main(verbose):
  """rOP meta-analysis of differential expression studies"""
  log_init(level=logging.DEBUG if verbose else logging.INFO)

@main.command()
@input_options
@click.option('--method', '-m', default=None, help='rOP, rOP_one_sided, Fisher, Stouffer, minP, maxP, vote_count')
@click.option('--r', type=int, help='Order statistic used by rOP')
@click.option('--auto-r', is_flag=True, default=None, help='Select r with the count criterion')
@click.option('--route', type=click.Choice(list(InferenceRoute.ALL)), help='How q-values are obtained')
@click.option('--permutations', type=int, help='Label permutations for the permutation route (default 500)')
@click.option('--alpha-vc', type=float, help='Per-study threshold for vote counting')
@click.option('--pi0', type=float, help='Null success rate for the pi0 vote-counting test')
@click.option('--vote-null', type=click.Choice([VoteNull.ALPHA, VoteNull.PI0]), help='Vote-counting null')
@handle_errors
def combine(config_path, method, r, alpha_vc, pi0, vote_null, **flags):
  """Combine per-study p-values and control the FDR"""
  from pipeline import run_pipeline
  overrides = {'method': method, 'r': r, 'alpha_vc': alpha_vc, 'pi0': pi0, 'vote_null': vote_null}
  config = build_run_config(config_path, overrides, **flags)
  with yaspin(text=f"Running {config.method.label()}..."):
    outputs = run_pipeline(config)
  for kind, path in outputs.items():
    print(f"{kind}: {path}")

@main.command(name='select-r')
@input_options
@handle_errors
def select_r(config_path, **flags):
  """Diagnostics for choosing r: detrended DE counts and, with --gmt, the pathway committee"""
  from pipeline import run_select_r
  flags['auto_r'] = True
  config = build_run_config(config_path, {'method': MetaMethods.ROP}, **flags)
  with yaspin(text="Computing r diagnostics..."):
    outputs = run_select_r(config)
  for kind, path in outputs.items():
    print(f"{kind}: {path}")

@main.command()
@click.option('--K', 'K', type=int, required=True, help='Number of studies')
@click.option('--vary', type=click.Choice(['r', 'r0']), default='r', help='Parameter to sweep')
@click.option('--values', default=None, help="Swept values, e.g. '1-10' (default 1..K)")
@click.option('--r', type=int, help='Fixed r when sweeping r0')
@click.option('--r0', type=int, help='Fixed r0 when sweeping r')
@click.option('--alpha', type=float, default=0.05, show_default=True)
@click.option('--beta-prime', type=float, default=1.0, show_default=True,
              help='Per-study rejection probability of affected studies')
@click.option('--theta', type=float, help='Effect size; replaces --beta-prime with t-test power')
@click.option('--n-per-group', type=int, help='Samples per class, used with --theta')
@click.option('--outdir', '-o', default='rop_output', type=click.Path())
@handle_errors
def power(K, vary, values, r, r0, alpha, beta_prime, theta, n_per_group, outdir):
  """Power curve of rOP over r or r0"""
  from pipeline import run_power
  swept = parse_int_list(values) if values else list(range(1, K + 1))
  outputs = run_power(outdir, K, vary, swept, alpha, beta_prime, r=r, r0=r0, theta=theta, n_per_group=n_per_group)
  print(f"power_curve: {outputs['power_curve']}")

@main.command()
@click.option('--config', 'config_path', type=click.Path(), help='JSON simulation settings')
@click.option('--scale', type=click.Choice(['desk', 'full']), default='desk', show_default=True)
@click.option('--replicates', type=int, help='Number of simulated datasets')
@click.option('--seed', type=int, help='Simulation seed')
@click.option('--stability-r', default='5,6,7', show_default=True, help='r values compared for detection overlap')
@click.option('--processes', type=int, default=1, show_default=True)
@click.option('--outdir', '-o', default='rop_simulation', type=click.Path())
@handle_errors
def simulate(config_path, scale, replicates, seed, stability_r, processes, outdir):
  """Benchmark the combination methods on correlated simulated studies"""
  from pipeline import run_simulation
  settings = load_json_config(config_path)
  if replicates is not None:
    settings['n_replicates'] = replicates
  if seed is not None:
    settings['seed'] = seed
  preset = SimConfig.desk_scale if scale == 'desk' else SimConfig.full_scale
  # unknown keys are rejected before the preset fills in the rest
  SimConfig.from_dict(settings)
  config = preset(**settings)
  with yaspin(text=f"Simulating {config.n_replicates} replicates..."):
    outputs = run_simulation(config, outdir, processes, parse_int_list(stability_r))
  for kind, path in outputs.items():
    print(f"{kind}: {path}")

@main.command(name='vote-count')
@click.option('--pvalues', required=True, type=click.Path(), help='Genes x studies p-value TSV')
@click.option('--alpha-vc', type=float, default=0.05, show_default=True)
@click.option('--pi0', type=float, default=0.5, show_default=True)
@click.option('--vote-null', type=click.Choice([VoteNull.ALPHA, VoteNull.PI0]), default=VoteNull.ALPHA,
              show_default=True)
@click.option('--fdr', type=float, default=0.05, show_default=True)
@click.option('--outdir', '-o', default='rop_output', type=click.Path())
@handle_errors
def vote_count(pvalues, alpha_vc, pi0, vote_null, fdr, outdir):
  """Count significant studies per gene and test the count"""
  from pipeline import run_vote_count
  spec = MetaMethodSpec(MetaMethods.VOTE_COUNT, alpha_vc=alpha_vc, pi0=pi0, vote_null=vote_null)
  outputs = run_vote_count(pvalues, outdir, spec, fdr)
  print(f"vote_count: {outputs['vote_count']}")

@main.command()
@click.option('--pvalues', type=click.Path(), help='Load this p-value TSV on start')
@handle_errors
def interactive(pvalues):
  """Menu-driven shell"""
  print("Welcome to the rOP meta-analysis shell!")
  state_machine = StateMachineModular()
  if pvalues:
    from study_io import load_pvalue_matrix
    with yaspin(text="Loading p-values..."):
      state_machine.set_matrix(load_pvalue_matrix(pvalues), source=pvalues)
  while not state_machine.is_exit_state():
    state_machine.execute_current_state()

if __name__ == "__main__":
  main()
