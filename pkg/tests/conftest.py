import pytest
from hypothesis import settings

settings.register_profile("qdual", max_examples=30, deadline=None)
settings.load_profile("qdual")


@pytest.fixture
def cli(capsys):
    """Run the command line in-process; returns (exit code, stdout, stderr)."""
    from qdual.cli import main

    def run(*argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr()
        return code, out.out, out.err

    return run
