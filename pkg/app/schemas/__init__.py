# Schemas module
from app.schemas.sequence import *
from app.schemas.interval import *
from app.schemas.certificate import *
from app.schemas.asymptotics import *
from app.schemas.bounds import *
from app.schemas.report import *
from app.schemas.cli import *
