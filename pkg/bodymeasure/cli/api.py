# 커맨드 그룹: 각 커맨드 모듈을 하나의 CLI 로 묶는다
import click

from bodymeasure import __version__
from bodymeasure.cli.commands import compare, evaluate, gen, predict, screen, split, train
from bodymeasure.core.exceptions import PipelineError


class PipelineGroup(click.Group):
    """PipelineError 를 한 줄 오류 메시지와 종료 코드로 바꾼다"""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except PipelineError as exc:
            click.echo(exc.one_line(), err=True)
            ctx.exit(exc.exit_code)


@click.group(cls=PipelineGroup)
@click.version_option(__version__, prog_name="bodymeasure")
def cli() -> None:
    """합성 인체 실루엣 기반 인체 치수 추정 파이프라인"""


# 각 커맨드 모듈 등록
cli.add_command(gen.command, name="gen")
cli.add_command(split.command, name="split")
cli.add_command(train.command, name="train")
cli.add_command(evaluate.command, name="eval")
cli.add_command(predict.command, name="predict")
cli.add_command(screen.command, name="screen")
cli.add_command(compare.command, name="compare")
